"""
Shared configuration, schemas and errors for the tvpinn toolkit
"""
