"""Data models for racks, groups, metrics, cochains and reports"""
