"""AUV Anchor Tools - anchor-cluster deployment planning for AUV navigation"""

__version__ = "0.1.0"
