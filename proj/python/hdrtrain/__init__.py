"""Perceptual encodings, losses, degradations, HDR metrics and significance
testing for training restoration networks on HDR/RAW images."""

from ._hdrtrain import *  # noqa: F401,F403
from ._hdrtrain import ContractError, DomainError  # noqa: F401

__version__ = "0.1.0"
