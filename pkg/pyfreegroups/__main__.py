"""Run `python -m pyfreegroups`."""
import sys

from .cli import main

sys.exit(main())
