"""Large-k asymptotics of S(x;t) = 3F2(1, ak, ak+1/2; tk+1, k+1; x).

Direct-summation oracle, closed-form and Laplace-engine expansion
coefficients, a uniform erfc expansion across the pole/saddle coalescence,
and a CLI that regenerates the reference error tables.
"""

__version__ = "0.1.0"
