"""
relmaze - relational maze planning with proposer-guided curriculum Q-learning
"""

__version__ = "0.3.0"
