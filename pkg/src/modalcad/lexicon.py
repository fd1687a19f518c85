"""Voice command lexicon: fuzzy phrase matching, thresholds, and spoken numbers.

Transcripts arrive as noisy ASR strings. Each one is scored against every
phrase and alias in the lexicon with a normalized edit-distance similarity,
and only candidates that clear their entry's acceptance threshold survive.
Thresholds are tunable per command (lower when a command is missed, raise
when it false-triggers).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

# Closed command set; the lexicon config must cover exactly these ids.
COMMAND_IDS = (
    "create_cube",
    "create_cylinder",
    "translate",
    "rotate",
    "scale",
    "enter",
    "escape",
    "undo",
    "greater",
    "smaller",
    "upwards",
    "down",
    "lateral",
    "lengthwise",
    "vertical",
    "front",
)

# Axis-constraint commands and the axis each one selects.
AXIS_COMMANDS = {"lateral": "x", "lengthwise": "y", "vertical": "z"}

THRESHOLD_FLOOR = 0.05
THRESHOLD_CEIL = 1.0


class LexiconError(ValueError):
    """Invalid lexicon configuration (bad schema, colliding phrases, unknown id)."""


@dataclass(frozen=True)
class LexiconEntry:
    id: str
    phrase: str
    threshold: float
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class Lexicon:
    """Ordered command dictionary; entry order is the match tie-break order."""

    entries: tuple[LexiconEntry, ...]

    def entry(self, command_id: str) -> LexiconEntry:
        for e in self.entries:
            if e.id == command_id:
                return e
        raise LexiconError(f"unknown command id {command_id!r}: not in the lexicon")

    def hud_listing(self) -> list[dict]:
        """Command list payload shown to clients (HUD)."""
        return [
            {
                "id": e.id,
                "phrase": e.phrase,
                "threshold": e.threshold,
                "aliases": list(e.aliases),
            }
            for e in self.entries
        ]


@dataclass(frozen=True)
class ScoredCommand:
    id: str
    score: float
    matched_phrase: str


_WS = re.compile(r"\s+")


def normalize(text: str) -> str:
    """Lowercase and collapse whitespace runs; the comparison form of a transcript."""
    return _WS.sub(" ", text.strip()).lower()


def _edit_distance(a: str, b: str) -> int:
    # Unit-cost Levenshtein, two-row dynamic programming.
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def similarity(a: str, b: str) -> float:
    """Similarity in [0, 1]: 1 − editDistance / max length, on normalized strings.

    Symmetric; 1.0 exactly when the normalized strings are equal (two empty
    strings count as equal).
    """
    na, nb = normalize(a), normalize(b)
    longest = max(len(na), len(nb))
    if longest == 0:
        return 1.0
    return 1.0 - _edit_distance(na, nb) / longest


def match_command(transcript: str, lexicon: Lexicon) -> ScoredCommand | None:
    """Best lexicon candidate clearing its threshold, or None.

    Every phrase and alias is scored; an entry's score is its best candidate.
    Ties go to the entry listed earlier in the lexicon.
    """
    best: ScoredCommand | None = None
    for entry in lexicon.entries:
        entry_score = -1.0
        entry_phrase = entry.phrase
        for candidate in (entry.phrase, *entry.aliases):
            s = similarity(transcript, candidate)
            if s > entry_score:
                entry_score = s
                entry_phrase = candidate
        if entry_score < entry.threshold:
            continue
        if best is None or entry_score > best.score:
            best = ScoredCommand(entry.id, entry_score, entry_phrase)
    return best


_UNITS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4,
    "five": 5, "six": 6, "seven": 7, "eight": 8, "nine": 9,
}
_TEENS = {
    "ten": 10, "eleven": 11, "twelve": 12, "thirteen": 13, "fourteen": 14,
    "fifteen": 15, "sixteen": 16, "seventeen": 17, "eighteen": 18, "nineteen": 19,
}
_TENS = {
    "twenty": 20, "thirty": 30, "forty": 40, "fifty": 50,
    "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90,
}
_DIGIT_STRING = re.compile(r"\d+(\.\d+)?")


def _parse_int_words(words: list[str]) -> int | None:
    if not words:
        return None
    total = 0
    rest = words
    if "hundred" in words:
        # Exactly "<one..nine> hundred [sub-hundred]".
        if len(words) < 2 or words[1] != "hundred" or "hundred" in words[2:]:
            return None
        lead = _UNITS.get(words[0])
        if not lead:
            return None
        total = lead * 100
        rest = words[2:]
        if not rest:
            return total
    if len(rest) == 1:
        w = rest[0]
        if w == "zero":
            return 0 if total == 0 else None
        for table in (_TEENS, _TENS, _UNITS):
            if w in table:
                return total + table[w]
        return None
    if len(rest) == 2:
        tens, unit = rest
        if tens in _TENS and unit in _UNITS and _UNITS[unit] != 0:
            return total + _TENS[tens] + _UNITS[unit]
    return None


def parse_number(transcript: str) -> float | None:
    """Parse a transcript that is wholly a number phrase; otherwise None.

    Accepts spoken English 0-999 ("forty five", "one hundred twenty"),
    an optional "point" followed by digit words ("two point one"), and
    plain digit strings ("45", "2.1").
    """
    text = normalize(transcript.replace("-", " "))
    if not text:
        return None
    if _DIGIT_STRING.fullmatch(text):
        return float(text)
    words = text.split()
    frac_digits = None
    if "point" in words:
        split = words.index("point")
        int_words, frac_words = words[:split], words[split + 1 :]
        if not int_words or not frac_words or "point" in frac_words:
            return None
        digits = []
        for w in frac_words:
            if w not in _UNITS:
                return None
            digits.append(str(_UNITS[w]))
        frac_digits = "".join(digits)
        words = int_words
    value = _parse_int_words(words)
    if value is None:
        return None
    if frac_digits is None:
        return float(value)
    # Build the decimal string so word input and digit input give the same float.
    return float(f"{value}.{frac_digits}")


def adjust_threshold(lexicon: Lexicon, command_id: str, direction: str, step: float) -> Lexicon:
    """Move one command's threshold by ±step, clamped to [0.05, 1.0].

    direction is "lower" (command is being missed) or "raise" (command
    false-triggers). Result is rounded to 9 decimals so repeated nudges
    stay on exact values.
    """
    if not 0.0 < step <= 0.5:
        raise ValueError(f"step must be in (0, 0.5], got {step}")
    if direction not in ("raise", "lower"):
        raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")
    target = lexicon.entry(command_id)  # raises LexiconError on unknown id
    delta = step if direction == "raise" else -step
    moved = round(target.threshold + delta, 9)
    clamped = min(max(moved, THRESHOLD_FLOOR), THRESHOLD_CEIL)
    entries = tuple(
        replace(e, threshold=clamped) if e.id == command_id else e for e in lexicon.entries
    )
    return Lexicon(entries)


def _entry_from_obj(obj: object, where: str) -> LexiconEntry:
    if not isinstance(obj, dict):
        raise LexiconError(f"{where}: entry must be a JSON object")
    allowed = {"id", "phrase", "threshold", "aliases"}
    unknown = set(obj) - allowed
    if unknown:
        raise LexiconError(f"{where}: unknown field(s) {sorted(unknown)}")
    for required in ("id", "phrase", "threshold"):
        if required not in obj:
            raise LexiconError(f"{where}: missing field {required!r}")
    cid = obj["id"]
    if cid not in COMMAND_IDS:
        raise LexiconError(f"{where}: unknown command id {cid!r}")
    phrase = obj["phrase"]
    if not isinstance(phrase, str) or not phrase or phrase != normalize(phrase):
        raise LexiconError(
            f"{where}: phrase must be non-empty, lowercase, whitespace-collapsed"
        )
    threshold = obj["threshold"]
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise LexiconError(f"{where}: threshold must be a number")
    if not 0.0 < float(threshold) <= 1.0:
        raise LexiconError(f"{where}: threshold must be in (0, 1], got {threshold}")
    aliases = obj.get("aliases", [])
    if not isinstance(aliases, list) or not all(isinstance(a, str) for a in aliases):
        raise LexiconError(f"{where}: aliases must be a list of strings")
    for a in aliases:
        if not a or a != normalize(a):
            raise LexiconError(
                f"{where}: alias {a!r} must be non-empty, lowercase, whitespace-collapsed"
            )
    return LexiconEntry(cid, phrase, float(threshold), tuple(aliases))


def parse_lexicon(text: str, source: str = "<lexicon>") -> Lexicon:
    """Parse a lexicon config (JSON array of entries) with line-precise errors."""
    decoder = json.JSONDecoder()

    def line_of(pos: int) -> int:
        return text.count("\n", 0, pos) + 1

    i = 0
    n = len(text)
    while i < n and text[i].isspace():
        i += 1
    if i >= n or text[i] != "[":
        raise LexiconError(f"{source}:{line_of(i)}: top-level value must be a JSON array")
    i += 1
    entries: list[LexiconEntry] = []
    lines: list[int] = []
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i < n and text[i] == "]":
            i += 1
            break
        start_line = line_of(i)
        try:
            obj, i = decoder.raw_decode(text, i)
        except json.JSONDecodeError as exc:
            raise LexiconError(f"{source}:{exc.lineno}: {exc.msg}") from exc
        entries.append(_entry_from_obj(obj, f"{source}:{start_line}"))
        lines.append(start_line)
        while i < n and text[i].isspace():
            i += 1
        if i < n and text[i] == ",":
            i += 1
        elif i < n and text[i] == "]":
            i += 1
            break
        else:
            raise LexiconError(f"{source}:{line_of(i)}: expected ',' or ']' after entry")
    if text[i:].strip():
        raise LexiconError(f"{source}:{line_of(i)}: unexpected content after the entry array")

    seen_ids: dict[str, int] = {}
    seen_phrases: dict[str, tuple[str, int]] = {}
    for entry, line in zip(entries, lines):
        where = f"{source}:{line}"
        if entry.id in seen_ids:
            raise LexiconError(f"{where}: duplicate command id {entry.id!r}")
        seen_ids[entry.id] = line
        for phrase in (entry.phrase, *entry.aliases):
            if phrase in seen_phrases:
                other_id, other_line = seen_phrases[phrase]
                raise LexiconError(
                    f"{where}: phrase {phrase!r} collides with {other_id!r} (line {other_line})"
                )
            seen_phrases[phrase] = (entry.id, line)
    missing = [cid for cid in COMMAND_IDS if cid not in seen_ids]
    if missing:
        raise LexiconError(f"{source}: missing command id(s): {', '.join(missing)}")
    return Lexicon(tuple(entries))


def load_lexicon(path: str | Path) -> Lexicon:
    """Load and validate a lexicon config file; aborts with a line-precise error."""
    p = Path(path)
    return parse_lexicon(p.read_text(encoding="utf-8"), source=str(p))


def default_lexicon() -> Lexicon:
    """The lexicon shipped with the package."""
    text = resources.files("modalcad").joinpath("data/default_lexicon.json").read_text("utf-8")
    return parse_lexicon(text, source="modalcad/data/default_lexicon.json")
