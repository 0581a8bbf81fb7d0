import pathlib
import sys

try:
    import geotri  # noqa: F401  (installed wheel)
except ImportError:
    root = pathlib.Path(__file__).resolve().parents[2]
    sys.path.insert(0, str(root / "build"))
    sys.path.insert(0, str(root / "python"))
