"""Tweet cleaning chain: case folding, entity stripping, punctuation removal,
tokenization, Indonesian affix stripping and stopword removal.
"""

import re
from dataclasses import dataclass, field
from importlib import resources

from ._io import read_text

_URL = re.compile(r"(?:\b[a-z][a-z0-9+.\-]*://|\bwww\.)\S+", re.IGNORECASE)
_MENTION = re.compile(r"@\w+")
_HASHTAG = re.compile(r"#(\w+)")
_SPACES = re.compile(r"\s+")

PARTICLES = ("lah", "kah", "pun", "tah")
POSSESSIVES = ("nya", "ku", "mu")
SUFFIXES = ("kan", "an", "i")
# longest alternatives first so "meng" wins over "me"
PREFIXES = (
    "meng", "meny", "mem", "men", "me",
    "peng", "peny", "pem", "pen", "pe",
    "ber", "ter", "di", "ke", "se",
)
MAX_PREFIX_REMOVALS = 2
MIN_STEM_LEN = 3
MIN_STEM_VOWELS = 2
_VOWELS = frozenset("aeiou")


def parse_stopwords(text):
    words = set()
    for line in text.splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def load_stopwords(path=None):
    """Load a stopword file (one word per line, ``#`` comments).

    Without ``path`` the bundled Indonesian list is returned.
    """
    if path is None:
        text = resources.files("sentimin").joinpath("data/stopwords_id.txt").read_text("utf-8")
    else:
        text = read_text(path)
    return parse_stopwords(text)


def _is_token(word):
    return bool(word) and word.isalnum() and case_fold(word) == word


@dataclass(frozen=True)
class PrepConfig:
    stopwords: frozenset = field(default_factory=load_stopwords)
    stem_enabled: bool = True
    min_token_len: int = 2
    keep_hashtag_body: bool = True

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        bad = sorted(w for w in self.stopwords if not _is_token(w))
        if bad:
            raise ValueError(f"stopwords must be lowercase alphanumeric tokens: {bad[:5]}")
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")


def case_fold(text):
    # per-character simple mapping; str.lower() expands U+0130 to two code points
    out = []
    for ch in text:
        low = ch.lower()
        out.append(low if len(low) == 1 else low[0])
    return "".join(out)


def strip_entities(text, keep_hashtag_body=True):
    """Delete URLs and @-mentions; unwrap or delete hashtags."""
    text = _URL.sub(" ", text)
    text = _MENTION.sub(" ", text)
    text = _HASHTAG.sub(r"\1" if keep_hashtag_body else " ", text)
    return _SPACES.sub(" ", text).strip()


def strip_punctuation(text):
    text = "".join(ch if ch.isalnum() or ch.isspace() else " " for ch in text)
    return _SPACES.sub(" ", text).strip()


def tokenize(text, min_token_len=2):
    return [tok for tok in text.split() if len(tok) >= min_token_len]


def _vowel_count(word):
    return sum(ch in _VOWELS for ch in word)


def _stem_ok(rest):
    return len(rest) >= MIN_STEM_LEN and _vowel_count(rest) >= MIN_STEM_VOWELS


def _strip_suffix(word, candidates):
    for suffix in candidates:
        if word.endswith(suffix) and _stem_ok(word[: -len(suffix)]):
            return word[: -len(suffix)]
    return word


def _strip_prefix(word):
    for prefix in PREFIXES:
        if word.startswith(prefix) and _stem_ok(word[len(prefix):]):
            return word[len(prefix):]
    return word


def _stem_once(word):
    word = _strip_suffix(word, PARTICLES)
    word = _strip_suffix(word, POSSESSIVES)
    word = _strip_suffix(word, SUFFIXES)
    for _ in range(MAX_PREFIX_REMOVALS):
        stripped = _strip_prefix(word)
        if stripped == word:
            break
        word = stripped
    return word


def stem(token):
    """Reduce an Indonesian word to a base form by affix stripping.

    One pass removes, in order, a particle (-lah, -kah, -pun, -tah), a
    possessive (-nya, -ku, -mu), a derivational suffix (-kan, -an, -i) and up
    to two prefixes. An affix is only removed when what remains has at least
    three letters and two vowels. Passes repeat until nothing changes, which
    makes ``stem`` idempotent.

    >>> stem("layanannya")
    'layan'
    >>> stem("membantu")
    'bantu'
    """
    while True:
        stemmed = _stem_once(token)
        if stemmed == token:
            return token
        token = stemmed


def remove_stopwords(tokens, stopwords):
    return [tok for tok in tokens if tok not in stopwords]


def preprocess(text, config=None):
    """Run the whole chain and return the list of tokens."""
    return preprocess_trace(text, config)["tokens"]


def preprocess_trace(text, config=None):
    """Like :func:`preprocess` but keep the output of every stage."""
    config = config or default_config()
    folded = case_fold(text)
    no_entities = strip_entities(folded, config.keep_hashtag_body)
    no_punct = strip_punctuation(no_entities)
    tokens = tokenize(no_punct, config.min_token_len)
    if config.stem_enabled:
        # stems keep >= 3 letters, so this only bites when min_token_len > 3
        stemmed = tokenize(" ".join(stem(tok) for tok in tokens), config.min_token_len)
    else:
        stemmed = list(tokens)
    kept = remove_stopwords(stemmed, config.stopwords)
    return {
        "raw": text,
        "case_fold": folded,
        "strip_entities": no_entities,
        "strip_punctuation": no_punct,
        "tokenize": tokens,
        "stem": stemmed,
        "tokens": kept,
    }


_DEFAULT = None


def default_config():
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = PrepConfig()
    return _DEFAULT
