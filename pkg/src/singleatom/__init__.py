"""Single-atom dipole trap and atom-photon entanglement simulation toolkit."""

__version__ = "0.1.0"
