"""
Unit Tests Package for qcg3.
"""
