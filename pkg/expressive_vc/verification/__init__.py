from .suites import fusion_suite, cln_suite, encoders_suite, losses_suite, run_suites, suite_names, format_table

__all__ = [
    'fusion_suite',
    'cln_suite',
    'encoders_suite',
    'losses_suite',
    'run_suites',
    'suite_names',
    'format_table'
]
