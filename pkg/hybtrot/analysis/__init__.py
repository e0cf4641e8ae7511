"""
Error analysis: ensemble statistics, closed-form bounds, the gate budget
error estimator, and result files.
"""
