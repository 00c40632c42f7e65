"""
JSON report emitted by the CLI.
"""

from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class Report(BaseModel):
    """
    Attributes:
        tool: Tool name
        version: Tool version
        command: Subcommand that produced the report
        input: Input descriptor (file name, generator arguments)
        payload: Per-analysis results
        timing: Wall-clock seconds per analysis, only with --timing
    """

    tool: str = "rackgeom"
    version: str
    command: str
    input: Dict[str, Any] = Field(default_factory=dict)
    payload: Dict[str, Any] = Field(default_factory=dict)
    timing: Optional[Dict[str, float]] = None
