"""Exception hierarchy shared by all modules."""


class TwodelError(Exception):
    pass


class ConstraintViolation(TwodelError, ValueError):
    """A string violates a gap, run-length or membership constraint."""


class DecodeFailure(TwodelError):
    """Decoding did not produce a verified result."""


class BranchFailure(DecodeFailure):
    """The dispatched repair branch found zero or several candidates."""

    def __init__(self, branch: str, reason: str):
        super().__init__(f"{branch}: {reason}")
        self.branch = branch
        self.reason = reason


class ClassificationError(DecodeFailure):
    """Counter residues form a pattern the case analysis rules out."""


class SegmentInversionError(DecodeFailure):
    """No string in the insertion ball carries the requested colour."""


class HashFamilyError(TwodelError, RuntimeError):
    """A hash family violates its colouring invariant (a broken table)."""


class NotACorruption(DecodeFailure):
    """No codeword lies within two deletions of the received word."""


class CorrectabilityError(TwodelError):
    """Two distinct codewords share a received word: the code is not two-deletion-correcting."""

    def __init__(self, y, candidates):
        super().__init__(f"received word {y} is reachable from {len(candidates)} codewords: {sorted(candidates)}")
        self.y = y
        self.candidates = candidates
