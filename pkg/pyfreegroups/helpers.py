"""pyfreegroups helper functions."""

import asyncio
from fractions import Fraction
from functools import wraps
from typing import Dict


def async_to_sync(f):
    """Decorator to run async function as sync."""

    @wraps(f)
    def wrapper(*args, **kwargs):
        return asyncio.run(f(*args, **kwargs))

    return wrapper


def fraction_to_dict(value: Fraction) -> Dict[str, int]:
    """Return the JSON form of an exact rational."""
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator}
