"""Simulation and verification toolkit for quantum cryptographic protocols.

Submodules
----------
qmath      finite-dimensional states, measurements and distances
discrim    optimal discrimination of state ensembles
extract    entropies and Toeplitz-hash randomness extraction
cointoss   quantum coin tossing protocols and their cheating strategies
relnet     relativistic protocols on a light-speed-limited event loop
attacklab  cheating attacks on two-party function evaluation
randexp    randomness expansion and nonlocal games
cli        command-line experiment runner
"""

__version__ = "0.1.0"
