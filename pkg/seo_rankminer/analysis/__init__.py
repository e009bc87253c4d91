"""
Statistics and association-rule mining over a collected dataset.
"""
