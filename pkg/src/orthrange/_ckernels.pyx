# cython: language_level=3
# Compiled twin of the pure-Python kernels; the source is shared verbatim.
include "_kernels.py"
