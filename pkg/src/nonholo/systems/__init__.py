"""Built-in example systems and the name registry used by the CLI."""

from .profiles import Profile
from .snakeboard import make_snakeboard
from .chaplygin import make_chaplygin
from .solid import make_solid
from .ball import make_ball

SYSTEMS = {
    "snakeboard": make_snakeboard,
    "chaplygin": make_chaplygin,
    "solid": make_solid,
    "ball": make_ball,
}


def make_system(name, params=None):
    try:
        builder = SYSTEMS[name]
    except KeyError:
        raise KeyError(f"unknown system '{name}'; available: "
                       + ", ".join(sorted(SYSTEMS))) from None
    return builder(params)


__all__ = ["Profile", "SYSTEMS", "make_system", "make_snakeboard",
           "make_chaplygin", "make_solid", "make_ball"]
