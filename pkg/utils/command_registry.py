"""
Command Registry
Central registry of CLI verbs: what each one needs and which handler runs it.
"""

from argparse import Namespace
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from utils.errors import ValidationError


@dataclass
class CommandMetadata:
    """Metadata for a CLI verb"""
    name: str
    description: str
    needs_input: bool = True
    payload: Optional[str] = None  # 'subspace', 'submodule' or 'basis_change'
    parameters: List[str] = field(default_factory=list)


@dataclass
class Command:
    """A parsed invocation: verb, inputs and numeric parameters."""
    verb: str
    inputs: List[str]
    params: Dict[str, Any]
    machine: bool = False
    batch: bool = False

    @classmethod
    def from_args(cls, args: Namespace) -> "Command":
        metadata = CommandRegistry.get_metadata(args.verb)
        # only the numeric parameters the verb declares are kept and validated
        params = {name: getattr(args, name) for name in metadata.parameters if getattr(args, name, None) is not None}
        command = cls(verb=args.verb, inputs=list(args.inputs or []), params=params,
                      machine=args.machine, batch=args.batch)
        command.validate()
        return command

    def validate(self):
        metadata = CommandRegistry.get_metadata(self.verb)
        for name, value in self.params.items():
            if value < 1:
                raise ValidationError(f"--{name.replace('_', '-')} must be positive, got {value}")
        if metadata.needs_input:
            if not self.inputs:
                raise ValidationError(f"'{self.verb}' needs an input file")
            if len(self.inputs) > 1 and not self.batch:
                raise ValidationError(f"'{self.verb}' takes one input file; use --batch for several")
        elif self.inputs:
            raise ValidationError(f"'{self.verb}' does not read an input file")


class CommandRegistry:
    """Registry for all available CLI verbs"""

    _commands: Dict[str, Dict[str, Any]] = {}

    @classmethod
    def register(cls, metadata: CommandMetadata, handler: Callable):
        cls._commands[metadata.name] = {
            'metadata': metadata,
            'handler': handler
        }

    @classmethod
    def get_command(cls, name: str) -> Dict[str, Any]:
        if name not in cls._commands:
            raise ValidationError(f"Command '{name}' not found in registry")
        return cls._commands[name]

    @classmethod
    def get_metadata(cls, name: str) -> CommandMetadata:
        return cls.get_command(name)['metadata']

    @classmethod
    def get_command_names(cls) -> List[str]:
        return list(cls._commands.keys())

    @classmethod
    def execute(cls, name: str, *args, **kwargs):
        return cls.get_command(name)['handler'](*args, **kwargs)


def command(name: str, description: str, needs_input: bool = True, payload: Optional[str] = None,
            parameters: Optional[List[str]] = None):
    """Decorator registering a handler under ``name``."""
    def decorator(handler: Callable) -> Callable:
        CommandRegistry.register(
            CommandMetadata(name, description, needs_input, payload, list(parameters or [])),
            handler,
        )
        return handler
    return decorator
