"""Exception hierarchy shared by all modules."""


class SidonComplexError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class ModulusTooSmallError(SidonComplexError, ValueError):
    pass


class NotSidonError(SidonComplexError, ValueError):
    pass


class BadBijectionError(SidonComplexError, ValueError):
    pass


class IndexOutOfRangeError(SidonComplexError, IndexError):
    pass


class NoExtensionError(SidonComplexError):
    """A partial map admits no extension with the required properties."""


class SizeLimitError(SidonComplexError):
    pass


class MalformedInputError(SidonComplexError, ValueError):
    pass


class IncompleteStarError(SidonComplexError):
    pass


class CoverageError(SidonComplexError):
    pass


class LinkEmbeddingError(SidonComplexError):
    pass


class InsufficientNeighborhoodError(SidonComplexError):
    pass


class OutOfBallError(SidonComplexError):
    pass


class SpecNotOddError(SidonComplexError):
    pass


class IllDefinedParityError(SidonComplexError):
    pass
