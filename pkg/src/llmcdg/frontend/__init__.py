from .ast import Module
from .interface import InterfaceSpec, NamingRules, ResetSpec, extract_interface
from .lexer import SourceUnit, Token, lex
from .parser import parse, parse_file, parse_source
from .printer import format_module

__all__ = [
    "InterfaceSpec",
    "Module",
    "NamingRules",
    "ResetSpec",
    "SourceUnit",
    "Token",
    "extract_interface",
    "format_module",
    "lex",
    "parse",
    "parse_file",
    "parse_source",
]
