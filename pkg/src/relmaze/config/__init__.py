"""Configuration management for relmaze"""
