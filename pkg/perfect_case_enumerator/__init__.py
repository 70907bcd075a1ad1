from .perfect_case_enumerator import (
    PerfectCaseEnumerator
)

