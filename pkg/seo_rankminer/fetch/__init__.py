"""
HTTP fetching under a fetch policy, and the site-level probes built on it.
"""

from .http import fetch_page, new_session, validate_url, HostThrottle, RobotsGate, ThreadSessions, session_for

__all__ = [
    'fetch_page',
    'new_session',
    'validate_url',
    'HostThrottle',
    'RobotsGate',
    'ThreadSessions',
    'session_for'
]
