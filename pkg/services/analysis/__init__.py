# Analysis services package
