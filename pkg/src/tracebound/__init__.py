"""Explicit bounds for the terms of the Arthur-Selberg trace formula on GL(2)."""
