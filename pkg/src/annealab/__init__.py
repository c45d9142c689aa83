# -*- coding: utf-8 -*-
"""
================================
 annealab
================================

Annealed Langevin dynamics of contrastive (InfoNCE) embeddings on spheres: exact
losses and gradients, annealing schedules, a seeded ensemble integrator, benchmark
landscapes with known barriers, and the diagnostics that check convergence against
the theory.
"""

__version__ = "0.1.0"

from . import classes, config, diagnostics, dynamics, landscapes, utils
from .classes import LocalStorage, StateStorage, SweepCheckpoint
from .dynamics import IntegratorConfig, run_ensemble, run_trajectory, sgld_step
from .geometry import Configuration, UnitVector
from .landscapes import SymmetricDoubleWell, TiltedDoubleWell, build_infonce_micro
from .potential import Cosine, Gaussian, InfoNCEPotential, PairSet, infonce_loss
from .schedules import Constant, Logarithmic
