"""Information quantities for symmetric alpha-stable laws.

Densities and scores (:mod:`stableinfo.stable`), relative entropy between
two scales and its scale derivative (:mod:`stableinfo.info`), and mixed
fractional information with its consistency check (:mod:`stableinfo.mfi`),
all on top of the adaptive quadrature in :mod:`stableinfo.quadrature`.
"""

__version__ = "0.1.0"

from .quadrature import Interval, QuadratureResult, Tolerance, integrate  # noqa: E402
from .stable import DensitySpec, log_pdf, pdf, pdf_dx, rescale  # noqa: E402

__all__ = [
    "DensitySpec",
    "Interval",
    "QuadratureResult",
    "Tolerance",
    "integrate",
    "log_pdf",
    "pdf",
    "pdf_dx",
    "rescale",
]
