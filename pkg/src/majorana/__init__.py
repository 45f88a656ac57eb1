"""Real Majorana spinor algebra, Pin(3,1) spin transformations, and the
rotor-kernel Fourier/Hankel transform pair built on them.

Submodules are loaded lazily (PEP 562) so that the command-line entry point
can configure threading environment variables before numpy is imported.
"""

_SUBMODULES = ("clifford", "lorentz", "fourier", "spherical", "hankel",
               "io", "verify", "cli")

__version__ = "0.1.0"
__all__ = list(_SUBMODULES)


def __getattr__(name):
    if name in _SUBMODULES:
        import importlib
        module = importlib.import_module("." + name, __name__)
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(set(globals()) | set(_SUBMODULES))
