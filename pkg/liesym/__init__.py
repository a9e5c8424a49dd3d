"""module entrypoint"""
__version__ = '0.1.0'
