"""finphase: deterministic econophysics simulations and analytics.

Subpackages cover the conservative money ledger (:mod:`finphase.ledger`),
kinetic wealth exchange (:mod:`finphase.exchange`), the firm/worker/bank
phase-plane economy (:mod:`finphase.firms`), phase-plane entropy and tail
metrics (:mod:`finphase.phase`), macro profit-rate identities
(:mod:`finphase.macro`), the reserve-risk interest floor
(:mod:`finphase.interest`), and sectoral balance accounting
(:mod:`finphase.sectors`). The ``finphase`` CLI exposes one subcommand per
area.
"""

__version__ = "0.1.0"
