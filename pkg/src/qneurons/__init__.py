"""Kernel-machine quantum neurons with an exact statevector backend."""
