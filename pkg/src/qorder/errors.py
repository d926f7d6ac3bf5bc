from __future__ import annotations


class QOrderError(ValueError):
    """Domain error carrying a short machine-readable ``code``.

    Codes in use: ``dim-mismatch``, ``empty-set``, ``not-isometry``,
    ``not-normalized``, ``not-unitary``, ``bad-index``, ``bad-spec``,
    ``too-few-states``, ``not-orthogonal``, ``bad-n``, ``bad-factor``,
    ``decode-failed``.
    """

    def __init__(self, code: str, message: str = ""):
        self.code = code
        self.message = message or code
        super().__init__(f"{code}: {self.message}")
