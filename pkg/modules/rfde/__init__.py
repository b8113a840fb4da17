"""RFDE solver: histories, prolongations, Picard continuation and well-posedness probes.

Sub-packages are imported explicitly (``modules.rfde.solver`` and so on); this
package stays import-light so that ``modules.rfde.errors`` loads without numpy work.
"""

__version__ = "0.1.0"
