# Pydantic output models
