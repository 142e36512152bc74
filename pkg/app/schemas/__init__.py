# Pydantic schemas package 