"""reviewaudit: mine app-store user comments for market-policy violations.

Pipeline: topic-model bootstrapping over policy texts, human triage of
proposed labels, semantic-rule extraction, rule matching over comment
streams, and per-app violation reporting.
"""

__version__ = "0.1.0"
