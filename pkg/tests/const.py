"""Constants used by tests"""

# Subgroup of F_2 whose graph has seven vertices, six of them bad
EXAMPLE_A2_GENERATORS = ["abAB", "bbbb", "aaa"]

# Injective homomorphism F_3 -> F_2 onto an index 2 subgroup
INDEX_TWO_IMAGES = ["aa", "b", "abA"]

CORPUS_FIXTURE = "homomorphism_corpus.json"

HOMOGENIZED_DEFECT = 4

# Lipschitz constant B + 2D of psi_bar_w when no generator has a nonzero value
LIPSCHITZ_BOUND = 8
