"""Subcommands of the `homoclinic` program."""

from .base import *
from .expansive import *
from .nonexpansive import *
from .spectral import *
from .suite import *
