"""Command-line interface for relmaze"""
