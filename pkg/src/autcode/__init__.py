"""Executable models of permutation, semilinear and interval-algebra codings.

Modules: ``permcore`` (permutation expressions), ``permlang`` (their text
syntax), ``coding_ce`` and ``coding_pi2`` (the two set codings), ``vspace``
(semilinear maps and subspaces), ``intalg`` (the interval algebra) and
``cli``.
"""

__version__ = "0.1.0"
