"""
3DS 2.0 Fraud Lab
"""

__version__ = "0.1.0"
