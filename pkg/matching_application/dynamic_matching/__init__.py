"""
Dynamic maximal matching without length-3 augmenting paths
"""

__version__ = "1.0.0"
