"""Exact computations in the Lawrence-Sullivan interval and its Deligne groupoid."""
from .core import Element, Generator, ad_power, add, bracket, concat, linear_part, scale
from .dgl import (
    CheckReport,
    DglContext,
    GeneratorMap,
    apply_diff,
    apply_map,
    check_d_squared,
    check_mc_preserved,
    check_morphism,
    mc_residual,
    perturb,
)
from .series import bch, bernoulli, exp_element, gauge, log_element
from .interval import (
    McDescriptor,
    build_interval,
    build_subdivision,
    classify_mc,
    connect,
    solve_mc,
)

__version__ = "0.1.0"
