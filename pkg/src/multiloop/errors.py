"""Exception hierarchy shared by the library and the CLI."""


class MultiloopError(Exception):
  """Base class for all library errors."""


class DataError(MultiloopError):
  """Input data is malformed, unsupported or incomplete."""


class VerificationError(MultiloopError):
  """A certificate or identity failed to hold."""
