"""Exception hierarchy shared by every pitchrank module.

Every error carries a stable machine-readable ``code`` (snake_case), used for
the CLI exit-code table and for the JSON error bodies of the live-session API.
"""

from __future__ import annotations


class PitchrankError(Exception):
    """Base class for all domain errors."""

    code = "error"


class InvalidEvent(PitchrankError):
    code = "invalid_event"


class MalformedLine(PitchrankError):
    """An event-log or session-log line violates the file format."""

    code = "malformed_line"

    def __init__(self, line_no: int, detail: str):
        super().__init__(f"line {line_no}: {detail}")
        self.line_no = line_no
        self.detail = detail


class UnknownPlayer(PitchrankError):
    code = "unknown_player"

    def __init__(self, player_id, match_id, line_no: int | None = None):
        loc = f" (line {line_no})" if line_no is not None else ""
        super().__init__(
            f"player {player_id!r} not in any lineup of match {match_id!r}{loc}"
        )
        self.player_id = player_id
        self.match_id = match_id
        self.line_no = line_no


class ClockOutOfRange(PitchrankError):
    code = "clock_out_of_range"

    def __init__(self, clock_s, line_no: int | None = None):
        loc = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"clock_s {clock_s!r} outside the valid period range{loc}")
        self.clock_s = clock_s
        self.line_no = line_no


class UnknownTeam(PitchrankError):
    code = "unknown_team"


class EmptyTrainingSet(PitchrankError):
    code = "empty_training_set"


class DegenerateData(PitchrankError):
    code = "degenerate_data"


class NoMatches(PitchrankError):
    code = "no_matches"


class MissingRating(PitchrankError):
    code = "missing_rating"

    def __init__(self, player_id):
        super().__init__(f"no prior rating for player {player_id!r}")
        self.player_id = player_id


class NothingEvaluable(PitchrankError):
    code = "nothing_evaluable"


class UnknownModel(PitchrankError):
    code = "unknown_model"


class UnknownSession(PitchrankError):
    code = "unknown_session"


class DuplicatePlayer(PitchrankError):
    code = "duplicate_player"


class PlayerOffPitch(PitchrankError):
    code = "player_off_pitch"


class ClockRegression(PitchrankError):
    code = "clock_regression"


class NotOnPitch(PitchrankError):
    code = "not_on_pitch"


class AlreadyUsed(PitchrankError):
    code = "already_used"


class CorruptLog(PitchrankError):
    code = "corrupt_log"

    def __init__(self, seq_no: int, detail: str = ""):
        msg = f"session log corrupt at sequence {seq_no}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.seq_no = seq_no
