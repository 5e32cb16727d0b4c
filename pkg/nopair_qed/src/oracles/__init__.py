"""
独立验证器：数值求积与有限差分
"""
