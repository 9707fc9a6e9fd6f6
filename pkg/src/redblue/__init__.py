"""Dichotomy tooling for CSPs of reflexive complete red/blue-coloured graphs.

Submodules:

- graphs     — coloured graphs, {0,1,*}-matrix encodings, powers, quotients
- homsearch  — homomorphism search, cores, polymorphisms
- decompose  — homogeneous sets, tractability recognition, block taxonomy
- polysolve  — the polynomial list-CSP solver for decomposable templates
- hardness   — NP-hardness certificates (odd cycles, patterns, quotient powers)
- classify   — the dichotomy classifier and full-homomorphism classifiers
- sandwich   — graph sandwich problems via coloured CSP instances
- smallgraphs— exhaustive enumeration of small structures up to isomorphism
- cli        — command-line front end, including the audit harness
"""

from . import graphs, homsearch  # noqa: F401
