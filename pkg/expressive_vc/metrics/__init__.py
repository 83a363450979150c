from .correlation import pearson, correlate_prosody, f0_summary

__all__ = [
    'pearson',
    'correlate_prosody',
    'f0_summary'
]
