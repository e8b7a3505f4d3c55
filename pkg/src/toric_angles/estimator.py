"""scikit-learn style wrapper around the Reeb/angle correspondence."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .correspondence import DEFAULT_MAX_ITER, angles_to_reeb, build_volume_function, reeb_to_angles
from .lattice_cone import check_good


class ReebAngleMap(BaseEstimator, TransformerMixin):
    """Rows of Reeb vectors to rows of cone angles, and back.

    ``fit`` validates the cone and builds its volume function; the data
    passed to it is ignored. With ``exact=True`` rows are converted to
    Fractions and ``transform`` returns an object array of exact values.
    """

    def __init__(self, normals=None, tol=1e-12, max_iter=DEFAULT_MAX_ITER, exact=False):
        self.normals = normals
        self.tol = tol
        self.max_iter = max_iter
        self.exact = exact

    def fit(self, X=None, y=None):
        if self.normals is None:
            raise ValueError("normals must be given")
        self.cone_ = check_good(self.normals)
        self.volume_function_ = build_volume_function(self.cone_)
        self.n_features_in_ = self.cone_.dim
        return self

    def _rows(self, X, width):
        if self.exact:
            from fractions import Fraction

            rows = [[Fraction(x) for x in row] for row in X]
        else:
            rows = np.asarray(X, dtype=float)
            if rows.ndim != 2:
                raise ValueError("expected a 2d array")
            rows = rows.tolist()
        for row in rows:
            if len(row) != width:
                raise ValueError(f"expected rows of length {width}, got {len(row)}")
        return rows

    def transform(self, X):
        check_is_fitted(self, "cone_")
        out = [reeb_to_angles(self.cone_, row).beta for row in self._rows(X, self.cone_.dim)]
        return np.array(out, dtype=object if self.exact else float)

    def inverse_transform(self, X):
        check_is_fitted(self, "cone_")
        out = [
            angles_to_reeb(self.cone_, row, tol=self.tol, max_iter=self.max_iter).xi
            for row in self._rows(X, self.cone_.d)
        ]
        return np.array(out, dtype=float)

    def score_volume(self, X):
        """``vol(Delta_xi)`` for each row."""
        check_is_fitted(self, "cone_")
        return np.array([self.volume_function_(row) for row in self._rows(X, self.cone_.dim)])
