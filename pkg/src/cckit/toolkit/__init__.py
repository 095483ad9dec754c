from .generators import generate
from .io import load, save, CcDocument

__all__ = ["generate", "load", "save", "CcDocument"]
