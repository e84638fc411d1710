"""两量子比特纠缠判据"""
