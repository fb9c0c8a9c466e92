"""Pluggable next-hop proposers"""
