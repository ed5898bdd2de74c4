"""Exception types shared across the pipeline."""


class AttributionError(Exception):
    """Base class for every error raised by shortattrib."""


class EmptyInput(AttributionError):
    def __init__(self, bad_lines=()):
        self.bad_lines = list(bad_lines)[:3]
        where = ", ".join(str(n) for n in self.bad_lines) or "none"
        super().__init__(f"no message line parsed (first unparseable lines: {where})")


class MalformedRecord(AttributionError):
    def __init__(self, line_no, reason=""):
        self.line_no = line_no
        msg = f"malformed record at line {line_no}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class EmptyVocabulary(AttributionError):
    pass


class UnknownAuthor(AttributionError):
    def __init__(self, author):
        self.author = author
        super().__init__(f"author {author!r} is not in the class index")


class DegenerateMatrix(AttributionError):
    pass


class EmptyEvaluation(AttributionError):
    pass


class LengthMismatch(AttributionError):
    pass


class LabelOutOfRange(AttributionError):
    pass


class TooFewDocuments(AttributionError):
    def __init__(self, author, n_docs, needed=3):
        self.author = author
        super().__init__(f"author {author!r} has {n_docs} documents, needs at least {needed}")


class InvalidProfile(AttributionError):
    pass


class ConfigError(AttributionError):
    def __init__(self, key, reason):
        self.key = key
        super().__init__(f"{key}: {reason}")


class VocabularyMismatch(AttributionError):
    pass
