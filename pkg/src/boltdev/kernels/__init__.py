"""Hot RHS kernels in two interchangeable implementations.

``numpy_kernels`` is fully vectorized plain numpy; ``numba_kernels`` holds
the same functions as jitted explicit loops (parallel over spatial cells,
cell-local writes only, so results are bit-identical for any thread
count).  Both expose identical signatures operating on raw arrays; see
``boltdev.backend`` for selection.
"""
