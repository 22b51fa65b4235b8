"""
Shared vocabularies used across schemas, services and the CLI.
"""

from app.models.enums import BaselineKind, DomainRule, ScaleKind, ScenarioId

__all__ = ["BaselineKind", "DomainRule", "ScaleKind", "ScenarioId"]
