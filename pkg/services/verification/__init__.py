# Verification services package
