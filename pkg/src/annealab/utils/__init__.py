# -*- coding: utf-8 -*-
"""
Utilities that are independent of classes.

Generic purpose only.
"""
from . import io, seeding
