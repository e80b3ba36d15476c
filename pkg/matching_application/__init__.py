"""
Dynamic Matching Service
Fully dynamic 3/2-approximate maximum matching with verifier, workloads and metrics
"""

__version__ = "1.0.0"
