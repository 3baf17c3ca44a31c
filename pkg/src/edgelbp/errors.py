"""Exception types shared across the package."""


class EdgeLbpError(Exception):
    """Base class for all edgelbp errors."""


class InvalidImageError(EdgeLbpError, ValueError):
    """Raster could not be decoded or has an unusable shape."""


class OutOfDomainError(EdgeLbpError, ValueError):
    """A per-pixel operation was asked about a pixel outside its domain."""


class EmptyShapeError(EdgeLbpError, ValueError):
    """Moment normalization requested for an image with no foreground."""


class SchemeMismatchError(EdgeLbpError, ValueError):
    """Feature vectors from different schemes (or dimensions) were mixed."""


class InvalidFeatureError(EdgeLbpError, ValueError):
    """A feature vector contains NaN or infinite values."""


class DegenerateLabelsError(EdgeLbpError, ValueError):
    """Training data does not contain at least two classes."""


class EmptyDatasetError(EdgeLbpError, ValueError):
    """Dataset root contains no classes or no loadable samples."""


class DegenerateClassError(EdgeLbpError, ValueError):
    """A class is too small to be split into train and test."""


class ExtractionError(EdgeLbpError, RuntimeError):
    """Feature extraction failed for a specific sample."""

    def __init__(self, sample_id, cause):
        super().__init__(f"feature extraction failed for sample {sample_id!r}: {cause}")
        self.sample_id = sample_id
        self.cause = cause
