from setuptools import setup

setup(
    name="ekboard",
    version="0.1b0",
    packages=["ekboard", "ekboard.keyring", "ekboard.ocr", "ekboard.css"],
    python_requires=">=3.10",
    install_requires=[
        "rich",
        "caterpillar-py",
        "cryptography",
        "numpy",
        "Pillow",
    ],
    extras_require={
        "test": ["pytest", "pycryptodome"],
    },
    package_data={
        "ekboard.keyring": ["pgpwords.txt"],
    },
    entry_points={
        "console_scripts": ["ekboard=ekboard.cmd:main"],
    },
    zip_safe=False
)
