"""Generic determinantal schemes: resolutions, Ext dimensions and Ulrich extensions over GF(p)."""

from __future__ import annotations

__version__ = "0.1.0"
