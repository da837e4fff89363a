# This makes the controllers directory a Python package
# Controllers hold the numerical work; routes only parse arguments and print reports
