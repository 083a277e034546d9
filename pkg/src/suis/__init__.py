"""Graphical signature authentication: draw a secret, not a password.

A signature is a set of strokes on a unit canvas, digitized onto a drawing
grid, embedded in a larger extended grid together with a shifted color
value and a randomly chosen storing-technique id, then sealed with
authenticated encryption and stored per user. Verification demands an
exact match of the metadata cells and a cell-set similarity at or above
the configured threshold, and re-encodes the record under a fresh random
technique after every successful login.
"""

from .analysis import (
    FarEstimate,
    SpaceReport,
    decade_bounds,
    exhaustive_guess_far,
    far_sweep,
    password_space,
    random_guess_far,
)
from .config import DEFAULT_PALETTE, STROKE_FORMAT_VERSION, RateLimitConfig, SystemConfig
from .encoding import (
    ColorPalette,
    DecodedRecord,
    ExtendedMatrix,
    ExtrasLayout,
    PaletteColor,
    decode_color,
    decode_record,
    deserialize,
    encode_color,
    encode_record,
    extras_in_reading_order,
    extras_layout,
    pick_technique,
    place_record,
    serialize,
)
from .envelope import SignatureRecordEnvelope, load_vault_key, open_envelope, seal
from .errors import (
    ConfigError,
    DuplicateUserError,
    InputError,
    IntegrityError,
    MalformedRecordError,
    RecordCorruptionError,
    StorageError,
    SuisError,
    TechniqueMismatchError,
    TransportError,
    UserNotFoundError,
)
from .flows import (
    RegistrationResult,
    SignatureTooSmallError,
    register_user,
    verify_user,
)
from .grid import (
    CellBitmap,
    GridSpec,
    Point,
    RasterConfig,
    Stroke,
    cell_of_point,
    rasterize,
)
from .matching import MatchOutcome, MatchPolicy, MatchReason, similarity, verify_match
from .strokefile import StrokeDocument, dump_stroke_file, load_stroke_file
from .vault import UserProfile, Vault

__version__ = "0.1.0"

__all__ = [
    "CellBitmap",
    "ColorPalette",
    "ConfigError",
    "DecodedRecord",
    "DEFAULT_PALETTE",
    "DuplicateUserError",
    "ExtendedMatrix",
    "ExtrasLayout",
    "FarEstimate",
    "GridSpec",
    "InputError",
    "IntegrityError",
    "MalformedRecordError",
    "MatchOutcome",
    "MatchPolicy",
    "MatchReason",
    "PaletteColor",
    "Point",
    "RasterConfig",
    "RateLimitConfig",
    "RecordCorruptionError",
    "RegistrationResult",
    "SignatureRecordEnvelope",
    "SignatureTooSmallError",
    "SpaceReport",
    "StorageError",
    "Stroke",
    "StrokeDocument",
    "STROKE_FORMAT_VERSION",
    "SuisError",
    "SystemConfig",
    "TechniqueMismatchError",
    "TransportError",
    "UserNotFoundError",
    "UserProfile",
    "Vault",
    "cell_of_point",
    "decade_bounds",
    "decode_color",
    "decode_record",
    "deserialize",
    "dump_stroke_file",
    "encode_color",
    "encode_record",
    "exhaustive_guess_far",
    "extras_in_reading_order",
    "extras_layout",
    "far_sweep",
    "load_stroke_file",
    "load_vault_key",
    "open_envelope",
    "password_space",
    "pick_technique",
    "place_record",
    "random_guess_far",
    "rasterize",
    "register_user",
    "seal",
    "serialize",
    "similarity",
    "verify_match",
    "verify_user",
]
