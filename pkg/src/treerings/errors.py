"""Exception types raised by the pipeline stages."""


class TreeRingError(Exception):
    """Base class for all errors raised by this package."""


class ImageTooSmall(TreeRingError):
    """Image is below the minimum size an operation supports."""


class NoForeground(TreeRingError):
    """Thresholding produced an empty foreground mask."""


class DimensionMismatch(TreeRingError):
    """Two rasters that must share dimensions do not."""


class UnreadableFile(TreeRingError):
    """A file or directory could not be read as image data."""


class MixedDimensions(TreeRingError):
    """Slices of one stack disagree in width or height."""


class UnsupportedFormat(TreeRingError):
    """Input is not a single-channel 8/16-bit PNG or TIFF."""


class CenterOutOfBounds(TreeRingError):
    """Polar center lies outside the image."""


class DegenerateRadius(TreeRingError):
    """Inscribed radius around the center is too small to resample."""


class NotAnExtremum(TreeRingError):
    """Persistence was requested for a pixel that is not an extremum."""


class UnsortedInput(TreeRingError):
    """A position list that must be sorted ascending is not."""


class RowOutOfRange(TreeRingError):
    """Requested angular row does not exist in the polar image."""


class BlurNotInGrid(TreeRingError):
    """Requested blur value is not one of the sweep grid's axes values."""


class EmptyGrid(TreeRingError):
    """A sweep grid axis has no values."""


class InvalidDiskSpec(TreeRingError):
    """Synthetic disk parameters violate their constraints."""
