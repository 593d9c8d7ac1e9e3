# --------------------------------------------------------------------------- #
# MODULE DESCRIPTION                                                          #
# --------------------------------------------------------------------------- #
"""Job Title Error Module; contains titlesim exception classes."""

# --------------------------------------------------------------------------- #
# CLASSES                                                                     #
# --------------------------------------------------------------------------- #


class JTError(Exception):
    """Base class for titlesim exceptions"""

    def __init__(self, mesg):
        """Create new JTError object with given error message."""
        super(JTError, self).__init__(mesg)
        self.mesg = mesg

    def __str__(self):
        """Return exception error message."""

        return "ERROR: %s" % self.mesg


class JTFatalError(JTError):
    """Class for fatal titlesim exceptions"""

    def __str__(self):
        """Return exception error message."""

        return "FATAL: %s" % self.mesg


class JTWarningError(JTError):
    """Class for warning titlesim exceptions. These are recorded and logged
    rather than raised, e.g. a reference title skipped at index build."""

    def __str__(self):
        """Return exception error message."""

        return "WARNING: %s" % self.mesg


class JTUsageError(JTFatalError):
    """Bad command line flag or parameter value."""


class JTDataError(JTFatalError):
    """Bad input data, or data violating an operation's precondition.

    If source (a file name) and line are given they are rendered in front of
    the message so the diagnostic names the offending file and line."""

    def __init__(self, mesg, source=None, line=None):
        """Create new JTDataError object."""
        super(JTDataError, self).__init__(mesg)
        self.source = source
        self.line = line

    def where(self):
        """Return 'source:line: ' prefix, or '' if neither is known."""

        if self.source is None and self.line is None:
            return ''
        if self.line is None:
            return '%s: ' % self.source
        return '%s:%d: ' % (self.source or '<input>', self.line)

    def __str__(self):
        """Return exception error message."""

        return "FATAL: %s%s" % (self.where(), self.mesg)
