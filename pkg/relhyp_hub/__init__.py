# relhyp_hub/__init__.py
"""
RelHyp Hub - вычислительный инструментарий для относительно гиперболических групп:
орошары, каспидальные пространства, комплексы групп и склейка границ.
"""

from relhyp_hub.logging_config import setup_logging

__all__ = ["setup_logging"]

__version__ = "0.1.0"
__author__ = "DuZZlo"
__email__ = "nickuhtov@gmail.com"
