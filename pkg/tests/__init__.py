"""
gridwave 测试包
"""
