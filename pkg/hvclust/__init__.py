# Init file for the hvclust package
__version__ = '0.1.0'
