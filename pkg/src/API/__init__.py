from .API import API
from .cli import build_parser, main
from .config import RunConfig

__all__ = [
    "API",
    "build_parser",
    "main",
    "RunConfig"
]
