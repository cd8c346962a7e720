from enum import IntEnum
from typing import Optional


class ZCAQError(Exception):
    class Error(IntEnum):
        DIMENSION_MISMATCH = 1  # Operands differ in length or shape
        NOT_UNIMODULAR = 2  # Entry magnitude differs from 1
        INVALID_PHASE = 3  # Entry is not a power of the q-th root of unity
        INVALID_ARGUMENT = 4  # Invalid parameter
        NOT_COMPLEMENTARY = 5  # Pair fails the GCP / ZCP property
        UNSUPPORTED_LENGTH = 6  # No stored or composable pair of that length
        UNKNOWN_SEED = 7  # No catalog entry of that name
        INCOMPATIBLE_SEEDS = 8  # Seeds cannot be combined into a quad
        MALFORMED_QUAD = 9  # Not four distinct arrays of equal size
        TRANSCRIPTION_ERROR = 10  # Catalog entry contradicts its own claim
        UNDERSAMPLED = 11  # Oversampling factor too small
        BOUND_VIOLATED = 12  # Measured PMEPR above the analytic bound
        SEARCH_TOO_LARGE = 13  # Search space above the hard cap
        PARSE_ERROR = 14  # Malformed sequence document
        UNKNOWN_FAMILY = 15  # Unknown ZCP family name
        FAMILY_MISMATCH = 16  # Pair length matches no family parameter

    def __init__(self, code: int, detail: Optional[str] = None):
        super().__init__()
        self.code = code
        self.detail = detail

    @property
    def name(self) -> str:
        try:
            return self.Error(self.code).name
        except ValueError:
            return 'ERR_UNKNOWN'

    def __repr__(self) -> str:
        return '<%s(%d)>' % (
            self.__class__.__name__,
            self.code
        )

    def __str__(self) -> str:
        msg = 'ZCAQError %d: %s' % (self.code, self.name)
        if self.detail:
            msg += ': %s' % self.detail
        return msg
