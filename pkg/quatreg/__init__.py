"""
quatreg: algebraic regularity workbench for quaternion-valued functions
"""

__version__ = "1.0.0"
__description__ = "Quaternionic forms, Fueter operators and algebraic regularity checks"
