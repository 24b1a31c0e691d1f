"""commsol: exact-arithmetic commensurators of Z^n and free groups F_k,
with desk-scale truncated models of the full solenoid and its metrics."""

__version__ = "0.1.0"
