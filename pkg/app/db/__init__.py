# File persistence package
