"""Core modules for configuration, logging and error types"""
