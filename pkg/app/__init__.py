# rlfont application package
