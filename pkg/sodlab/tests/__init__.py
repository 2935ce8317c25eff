"""
sodlab Test Suite
Tests for the type A engine, decompositions, HN filtrations, mutation graphs and X(2)
"""
