"""
Test suite for the Contractive Inequality Lab
"""
