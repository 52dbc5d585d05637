"""Oracles, dataset generators, file formats, verification and benchmarks."""
