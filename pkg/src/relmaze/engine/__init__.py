"""Tabular Q-learning engine"""
