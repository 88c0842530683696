from __future__ import annotations

from ..utils._exceptions import DependencyError, InvalidInputError


class MissingArtifactError(DependencyError):
    """Raised when a subcommand needs an artifact an earlier step did not write."""

    module = "cli"

    def __init__(self, artifact: str, producer: str):
        super().__init__(
            f"""
            Missing artifact {artifact}, Possible ways to fix this:
            - Run `regland {producer}` on the same artifact directory first.
            - Run the whole pipeline with `regland run --config <file>`.
            """
        )


class ConfigError(InvalidInputError):
    """Raised when a configuration file cannot be read."""

    module = "cli"


class StageInputError(InvalidInputError):
    """Raised when a stage builds a model from invalid data, e.g. a bad input CSV."""

    module = "cli"

    def __init__(self, stage: str, detail: str):
        super().__init__(
            f"""
            Stage {stage} rejected its input: {detail}, Possible ways to fix this:
            - Check the files named by potential_file and rhs_file.
            - Regenerate the artifact directory with `regland gen-potential`.
            """
        )
