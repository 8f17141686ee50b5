"""Continuous-variable teleportation with Gaussian and photon-subtracted
entangled resources, with a truncated Fock-space oracle for every closed form."""

__version__ = "0.1.0"
