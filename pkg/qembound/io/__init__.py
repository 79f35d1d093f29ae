"""Read and write result files.

Results are written as JSON lines (one record per line, keys sorted, so
that reruns under the same seed are byte-identical) and as CSV tables with
a fixed column order and 17 significant digits.
"""
