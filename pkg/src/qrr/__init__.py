"""Exact truncated q-series engine for Rogers-Ramanujan type identities."""
