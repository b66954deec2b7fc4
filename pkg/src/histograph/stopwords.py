"""Default stopword list for the title-word frequency table."""

from __future__ import annotations

from pathlib import Path

DEFAULT_STOPWORDS = frozenset(
    """
    a about above after again against all also am an and any are as at be
    because been before being below between both but by can cannot could did
    do does doing down during each few following for from further had has have
    having he her here hers herself him himself his how i if in into is it its
    itself may me more most my myself new no nor not note of off on once only
    or other ought our ours ourselves out over own per same she should so some
    such than that the their theirs them themselves then there these they this
    those through to too under until up upon use used using very via was we
    were what when where which while who whom why will with within without
    would you your yours yourself yourselves
    """.split()
)


def load_stopwords(path) -> frozenset[str]:
    """Read a stopword file: one word per line, blanks and #-comments ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)
