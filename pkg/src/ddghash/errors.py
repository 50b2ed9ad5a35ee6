"""Exception types shared across the toolkit."""


class DdghashError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class NoInstructionsFound(DdghashError):
    """Input text contains no recognizable instruction lines."""


class MalformedListing(DdghashError):
    """Too many instruction-shaped lines failed to parse (> threshold)."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"{len(report.malformed)} of {report.instruction_shaped} "
            "instruction-shaped lines are malformed"
        )


class UnparsableOperand(DdghashError):
    def __init__(self, token):
        self.token = token
        super().__init__(f"cannot parse operand {token!r}")


class EmptyGraph(DdghashError):
    """Hashing requested for a graph with no nodes."""


class IncompatibleCorpora(DdghashError):
    """Feature sets built under different extraction settings."""


class EmptyCorpus(DdghashError):
    pass


class ZeroVector(DdghashError):
    pass


class UnknownProgram(DdghashError):
    def __init__(self, program_id):
        self.program_id = program_id
        super().__init__(f"no program {program_id!r} in corpus")
