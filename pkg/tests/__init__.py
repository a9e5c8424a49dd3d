"""liesym test suite"""
